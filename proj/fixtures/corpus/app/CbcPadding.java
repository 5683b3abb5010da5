package fixtures.app;

import javax.crypto.Cipher;
import javax.crypto.KeyGenerator;
import javax.crypto.SecretKey;
import javax.crypto.spec.IvParameterSpec;

// CBC with PKCS#5 padding: decryption errors become a padding oracle.
public class CbcPadding {
    public byte[] decrypt(byte[] ciphertext, IvParameterSpec iv) throws Exception {
        KeyGenerator generator = KeyGenerator.getInstance("AES");
        SecretKey key = generator.generateKey();
        Cipher cipher = Cipher.getInstance("AES/CBC/PKCS5Padding");
        cipher.init(Cipher.DECRYPT_MODE, key, iv);
        byte[] plaintext = cipher.doFinal(ciphertext);
        return plaintext;
    }
}
